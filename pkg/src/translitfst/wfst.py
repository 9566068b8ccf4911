"""Weighted finite-state transducers over the tropical semiring.

Machines are built with :meth:`Fst.add_state` / :meth:`Fst.add_arc` and are
treated as read-only once handed to an algorithm; every algorithm here returns
a fresh machine.
"""

from __future__ import annotations

import heapq
import itertools
import math
import pathlib
from collections import defaultdict, deque
from typing import Iterable, NamedTuple, Optional, Sequence

EPSILON = "<eps>"

ZERO = math.inf
ONE = 0.0


def plus(a: float, b: float) -> float:
    return a if a <= b else b


def times(a: float, b: float) -> float:
    return a + b


class FstError(ValueError):
    pass


class UnknownSymbolError(FstError):
    def __init__(self, symbols):
        self.symbols = list(symbols)
        shown = ", ".join(repr(s) for s in self.symbols)
        super().__init__(f"unknown symbol(s): {shown}")


class SymbolTable:
    """Bijection between symbol strings and integer labels; label 0 is epsilon."""

    def __init__(self, symbols: Iterable[str] = ()):
        self._sym2id = {EPSILON: 0}
        self._id2sym = [EPSILON]
        for s in symbols:
            self.add_symbol(s)

    def add_symbol(self, symbol: str) -> int:
        found = self._sym2id.get(symbol)
        if found is not None:
            return found
        if not symbol or "\t" in symbol or "\n" in symbol:
            raise FstError(f"invalid symbol {symbol!r}")
        label = len(self._id2sym)
        self._sym2id[symbol] = label
        self._id2sym.append(symbol)
        return label

    def find(self, symbol: str) -> int:
        try:
            return self._sym2id[symbol]
        except KeyError:
            raise UnknownSymbolError([symbol]) from None

    def symbol(self, label: int) -> str:
        return self._id2sym[label]

    def __contains__(self, symbol) -> bool:
        return symbol in self._sym2id

    def __len__(self) -> int:
        return len(self._id2sym)

    def __iter__(self):
        return iter(enumerate(self._id2sym))

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolTable) and self._id2sym == other._id2sym

    def __hash__(self):
        return hash(tuple(self._id2sym))

    def __repr__(self):
        return f"SymbolTable({len(self)} symbols)"

    def user_symbols(self) -> list[str]:
        return self._id2sym[1:]

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for label, sym in enumerate(self._id2sym):
                f.write(f"{sym}\t{label}\n")

    @classmethod
    def read(cls, path) -> "SymbolTable":
        table = cls()
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    sym, label = line.split("\t")
                    label = int(label)
                except ValueError:
                    raise FstError(f"{path}:{lineno}: malformed symbol line") from None
                if label == 0:
                    if sym != EPSILON:
                        raise FstError(f"{path}:{lineno}: label 0 must be {EPSILON}")
                    continue
                if table.add_symbol(sym) != label:
                    raise FstError(f"{path}:{lineno}: labels must be dense and ordered")
        return table


def merge_tables(tables: Iterable[SymbolTable]) -> SymbolTable:
    merged = SymbolTable()
    for t in tables:
        for sym in t.user_symbols():
            merged.add_symbol(sym)
    return merged


class Arc(NamedTuple):
    ilabel: int
    olabel: int
    weight: float
    nextstate: int


class Path(NamedTuple):
    """One accepting path, with labels resolved to symbol strings (epsilons dropped)."""

    isymbols: tuple
    osymbols: tuple
    weight: float

    @property
    def istring(self) -> str:
        return "".join(self.isymbols)

    @property
    def ostring(self) -> str:
        return "".join(self.osymbols)


class Fst:
    def __init__(self, isyms: SymbolTable, osyms: Optional[SymbolTable] = None):
        self.isyms = isyms
        self.osyms = isyms if osyms is None else osyms
        self.start = -1
        self._arcs: list[list[Arc]] = []
        self._finals: dict[int, float] = {}

    # construction

    def add_state(self) -> int:
        self._arcs.append([])
        return len(self._arcs) - 1

    def set_start(self, state: int) -> None:
        self._check_state(state)
        self.start = state

    def set_final(self, state: int, weight: float = ONE) -> None:
        self._check_state(state)
        if weight == ZERO:
            self._finals.pop(state, None)
        else:
            self._finals[state] = float(weight)

    def add_arc(self, state: int, ilabel: int, olabel: int, weight: float, nextstate: int) -> None:
        self._check_state(state)
        self._check_state(nextstate)
        if not 0 <= ilabel < len(self.isyms):
            raise FstError(f"input label {ilabel} not in symbol table")
        if not 0 <= olabel < len(self.osyms):
            raise FstError(f"output label {olabel} not in symbol table")
        self._arcs[state].append(Arc(ilabel, olabel, float(weight), nextstate))

    def _check_state(self, state: int) -> None:
        if not 0 <= state < len(self._arcs):
            raise FstError(f"invalid state id {state}")

    # access

    @property
    def num_states(self) -> int:
        return len(self._arcs)

    def states(self) -> range:
        return range(len(self._arcs))

    def arcs(self, state: int) -> Sequence[Arc]:
        return self._arcs[state]

    def final(self, state: int) -> float:
        return self._finals.get(state, ZERO)

    def is_final(self, state: int) -> bool:
        return state in self._finals

    @property
    def finals(self) -> dict[int, float]:
        return dict(self._finals)

    def num_arcs(self) -> int:
        return sum(len(a) for a in self._arcs)

    def structurally_equal(self, other: "Fst") -> bool:
        return (
            self.start == other.start
            and self._arcs == other._arcs
            and self._finals == other._finals
            and self.isyms == other.isyms
            and self.osyms == other.osyms
        )

    def __repr__(self):
        return f"<Fst {self.num_states} states, {self.num_arcs()} arcs, start={self.start}>"

    # text format

    def write_text(self, path) -> None:
        pathlib.Path(path).write_text(self.to_text(), encoding="utf-8", newline="\n")

    def to_text(self) -> str:
        lines = []
        if self.start < 0:
            return ""
        order = [self.start] + [s for s in self.states() if s != self.start]
        for s in order:
            for arc in self._arcs[s]:
                lines.append(
                    f"{s}\t{arc.nextstate}\t{self.isyms.symbol(arc.ilabel)}"
                    f"\t{self.osyms.symbol(arc.olabel)}\t{arc.weight!r}"
                )
            if s in self._finals:
                lines.append(f"{s}\t{self._finals[s]!r}")
            elif s == self.start and not self._arcs[s]:
                # keeps the start recoverable when it has no arcs
                lines.append(f"{s}\tinf")
        return "".join(line + "\n" for line in lines)

    @classmethod
    def read_text(cls, path, isyms: SymbolTable, osyms: SymbolTable) -> "Fst":
        return cls.from_text(pathlib.Path(path).read_text(encoding="utf-8"), isyms, osyms, source=str(path))

    @classmethod
    def from_text(cls, text: str, isyms: SymbolTable, osyms: SymbolTable, source="<text>") -> "Fst":
        fst = cls(isyms, osyms)
        records = []
        max_state = -1
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            fields = line.split("\t")
            try:
                if len(fields) == 5:
                    src, dst = int(fields[0]), int(fields[1])
                    rec = (src, dst, isyms.find(fields[2]), osyms.find(fields[3]), float(fields[4]))
                    max_state = max(max_state, src, dst)
                elif len(fields) == 2:
                    rec = (int(fields[0]), float(fields[1]))
                    max_state = max(max_state, rec[0])
                else:
                    raise ValueError("expected 2 or 5 tab-separated fields")
            except (ValueError, UnknownSymbolError) as e:
                raise FstError(f"{source}:{lineno}: {e}") from None
            records.append(rec)
        for _ in range(max_state + 1):
            fst.add_state()
        if not records:
            fst.set_start(fst.add_state())
            return fst
        fst.set_start(records[0][0])
        for rec in records:
            if len(rec) == 5:
                fst.add_arc(rec[0], rec[2], rec[3], rec[4], rec[1])
            else:
                fst.set_final(rec[0], rec[1])
        return fst


def linear_acceptor(symbols: Sequence[str], table: SymbolTable) -> Fst:
    """Chain machine accepting exactly ``symbols`` with weight one."""
    missing = [s for s in symbols if s not in table or s == EPSILON]
    if missing:
        raise UnknownSymbolError(dict.fromkeys(missing))
    fst = Fst(table, table)
    state = fst.add_state()
    fst.set_start(state)
    for sym in symbols:
        nxt = fst.add_state()
        label = table.find(sym)
        fst.add_arc(state, label, label, ONE, nxt)
        state = nxt
    fst.set_final(state, ONE)
    return fst


def invert(t: Fst) -> Fst:
    out = Fst(t.osyms, t.isyms)
    for _ in t.states():
        out.add_state()
    if t.start >= 0:
        out.set_start(t.start)
    for s in t.states():
        for arc in t.arcs(s):
            out._arcs[s].append(Arc(arc.olabel, arc.ilabel, arc.weight, arc.nextstate))
    out._finals = dict(t._finals)
    return out


def compose(a: Fst, b: Fst) -> Fst:
    """Composition with the three-state epsilon-sequencing filter.

    Filter state 0 allows any move; 1 means only ``b`` has been taking
    input-epsilon moves alone; 2 means only ``a`` has been taking
    output-epsilon moves alone.  A path never mixes the two lone-move kinds
    without a real match in between, so each pair of component paths is
    realized once.
    """
    if a.osyms != b.isyms:
        raise FstError("symbol table mismatch: a.osyms != b.isyms")
    out = Fst(a.isyms, b.osyms)
    if a.start < 0 or b.start < 0:
        out.set_start(out.add_state())
        return out

    b_index = []
    for s in b.states():
        by_label = defaultdict(list)
        for arc in b.arcs(s):
            by_label[arc.ilabel].append(arc)
        b_index.append(by_label)

    ids: dict[tuple, int] = {}
    queue = deque()

    def state_of(key):
        sid = ids.get(key)
        if sid is None:
            sid = ids[key] = out.add_state()
            queue.append(key)
        return sid

    out.set_start(state_of((a.start, b.start, 0)))
    while queue:
        key = queue.popleft()
        q1, q2, f = key
        src = ids[key]
        fw = times(a.final(q1), b.final(q2))
        if fw != ZERO:
            out.set_final(src, fw)
        for a1 in a.arcs(q1):
            if a1.olabel != 0:
                for a2 in b_index[q2].get(a1.olabel, ()):
                    dst = state_of((a1.nextstate, a2.nextstate, 0))
                    out._arcs[src].append(Arc(a1.ilabel, a2.olabel, a1.weight + a2.weight, dst))
            else:
                if f == 0:
                    for a2 in b_index[q2].get(0, ()):
                        dst = state_of((a1.nextstate, a2.nextstate, 0))
                        out._arcs[src].append(Arc(a1.ilabel, a2.olabel, a1.weight + a2.weight, dst))
                if f != 1:
                    dst = state_of((a1.nextstate, q2, 2))
                    out._arcs[src].append(Arc(a1.ilabel, 0, a1.weight, dst))
        if f != 2:
            for a2 in b_index[q2].get(0, ()):
                dst = state_of((q1, a2.nextstate, 1))
                out._arcs[src].append(Arc(0, a2.olabel, a2.weight, dst))
    return out


def _accessible(t: Fst) -> set:
    seen = {t.start}
    stack = [t.start]
    while stack:
        s = stack.pop()
        for arc in t.arcs(s):
            if arc.nextstate not in seen:
                seen.add(arc.nextstate)
                stack.append(arc.nextstate)
    return seen


def _coaccessible(t: Fst) -> set:
    rev = defaultdict(list)
    for s in t.states():
        for arc in t.arcs(s):
            rev[arc.nextstate].append(s)
    seen = set(t._finals)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for p in rev[s]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def connect(t: Fst) -> Fst:
    """Keep only states that lie on some start-to-final path, renumbered in order."""
    out = Fst(t.isyms, t.osyms)
    if t.start < 0:
        out.set_start(out.add_state())
        return out
    keep = _accessible(t) & _coaccessible(t)
    if t.start not in keep:
        out.set_start(out.add_state())
        return out
    remap = {}
    for s in t.states():
        if s in keep:
            remap[s] = out.add_state()
    out.set_start(remap[t.start])
    for s, ns in remap.items():
        for arc in t.arcs(s):
            if arc.nextstate in keep:
                out._arcs[ns].append(arc._replace(nextstate=remap[arc.nextstate]))
        if s in t._finals:
            out._finals[ns] = t._finals[s]
    return out


def distance_to_final(t: Fst) -> list[float]:
    """Shortest distance from every state to a final state (final weight included).

    Label-correcting relaxation, so negative arcs are fine as long as there
    is no negative cycle.
    """
    rev = defaultdict(list)
    for s in t.states():
        for arc in t.arcs(s):
            rev[arc.nextstate].append((s, arc.weight))
    dist = [ZERO] * t.num_states
    queue = deque()
    queued = set()
    for s, w in t._finals.items():
        dist[s] = w
        queue.append(s)
        queued.add(s)
    while queue:
        s = queue.popleft()
        queued.discard(s)
        for p, w in rev[s]:
            nd = w + dist[s]
            if nd < dist[p]:
                dist[p] = nd
                if p not in queued:
                    queued.add(p)
                    queue.append(p)
    return dist


def shortest_paths(t: Fst, n: Optional[int] = 1, unique_outputs: bool = False) -> list[Path]:
    """Up to ``n`` accepting paths, cheapest first.

    Equal weights are ordered by output string.  ``n=None`` enumerates every
    path and therefore only terminates on machines with finitely many paths.
    With ``unique_outputs`` only the cheapest path per output string is kept.
    """
    if n is not None and n < 1:
        raise ValueError("n must be positive")
    if t.start < 0 or t.num_states == 0:
        return []
    heuristic = distance_to_final(t)
    if heuristic[t.start] == ZERO:
        return []

    osym = t.osyms.symbol
    counter = itertools.count()
    # heap items: (bound, ostring, tiebreak, kind, state, g, back-pointer)
    # kind 0 = finished path, 1 = partial path; back-pointer = (parent, arc)
    heap = [(heuristic[t.start], "", next(counter), 1, t.start, ONE, None)]
    pops = defaultdict(int)
    expanded = set()
    results = []
    seen_outputs = set()
    while heap:
        bound, ostr, _, kind, state, g, back = heapq.heappop(heap)
        if kind == 0:
            if unique_outputs:
                if ostr in seen_outputs:
                    continue
                seen_outputs.add(ostr)
            results.append(_trace(t, back, g))
            if n is not None and len(results) >= n:
                break
            continue
        if unique_outputs:
            # later arrivals with the same output prefix can only repeat outputs
            if (state, ostr) in expanded:
                continue
            expanded.add((state, ostr))
        elif n is not None:
            if pops[state] >= n:
                continue
            pops[state] += 1
        fw = t.final(state)
        if fw != ZERO:
            heapq.heappush(heap, (g + fw, ostr, next(counter), 0, state, g + fw, back))
        for arc in t.arcs(state):
            h = heuristic[arc.nextstate]
            if h == ZERO:
                continue
            ng = g + arc.weight
            nstr = ostr + osym(arc.olabel) if arc.olabel else ostr
            heapq.heappush(heap, (ng + h, nstr, next(counter), 1, arc.nextstate, ng, (back, arc)))
    results.sort(key=lambda p: (p.weight, p.ostring))
    return results


def _trace(t: Fst, back, weight: float) -> Path:
    arcs = []
    while back is not None:
        back, arc = back
        arcs.append(arc)
    arcs.reverse()
    ins = tuple(t.isyms.symbol(a.ilabel) for a in arcs if a.ilabel)
    outs = tuple(t.osyms.symbol(a.olabel) for a in arcs if a.olabel)
    return Path(ins, outs, weight)


def union(machines: Sequence[Fst], isyms: SymbolTable, osyms: SymbolTable) -> Fst:
    """Fresh start state with epsilon arcs into each machine, relabelled onto shared tables."""
    out = Fst(isyms, osyms)
    start = out.add_state()
    out.set_start(start)
    for m in machines:
        imap = [isyms.find(m.isyms.symbol(i)) if i else 0 for i in range(len(m.isyms))]
        omap = [osyms.find(m.osyms.symbol(i)) if i else 0 for i in range(len(m.osyms))]
        offset = out.num_states
        for _ in m.states():
            out.add_state()
        if m.start < 0:
            continue
        out._arcs[start].append(Arc(0, 0, ONE, m.start + offset))
        for s in m.states():
            for arc in m.arcs(s):
                out._arcs[s + offset].append(
                    Arc(imap[arc.ilabel], omap[arc.olabel], arc.weight, arc.nextstate + offset)
                )
            if m.is_final(s):
                out._finals[s + offset] = m.final(s)
    return out


def identity_transducer(table: SymbolTable) -> Fst:
    """Single-state machine mapping every symbol to itself."""
    fst = Fst(table, table)
    s = fst.add_state()
    fst.set_start(s)
    fst.set_final(s)
    for label, _ in table:
        if label:
            fst.add_arc(s, label, label, ONE, s)
    return fst
